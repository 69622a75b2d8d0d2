from .display import create_display, DisplayBase, InteractiveDisplay, QuietDisplay

__all__ = [
    'create_display',
    'DisplayBase',
    'InteractiveDisplay',
    'QuietDisplay'
]
