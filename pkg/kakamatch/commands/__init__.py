"""Commands module for the kakamatch CLI."""

# Import utility functions
from .utils import (
    console,
    dump_json,
    emit_json,
    get_display_path,
    require_dir,
    require_file,
    resolve_labels,
)

from .frames import cmd_select_frames
from .features import cmd_features
from .match import cmd_compare_matchers, cmd_match
from .rank import cmd_rank
from .evaluate import cmd_evaluate
from .synth import cmd_synth
from .visualize import cmd_visualize

__all__ = [
    # Utils
    'console',
    'dump_json',
    'emit_json',
    'get_display_path',
    'require_dir',
    'require_file',
    'resolve_labels',
    # Commands
    'cmd_select_frames',
    'cmd_features',
    'cmd_match',
    'cmd_compare_matchers',
    'cmd_rank',
    'cmd_evaluate',
    'cmd_synth',
    'cmd_visualize',
]
