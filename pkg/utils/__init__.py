from .logger import setup_logger
from .validators import validate_positive, validate_int, validate_int_list, validate_node_count, validate_choices

__all__ = ['setup_logger', 'validate_positive', 'validate_int', 'validate_int_list',
           'validate_node_count', 'validate_choices']
