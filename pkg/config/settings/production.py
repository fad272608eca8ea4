from .local import *

DEBUG = os.getenv('PLANAR_DEBUG', 'False') == 'True'

QUADRATURE = {
    **QUADRATURE,
    'TOLERANCE': float(os.getenv('PLANAR_QUAD_TOLERANCE', 1e-13)),
}

ENSEMBLE = {
    **ENSEMBLE,
    'THREADS': int(os.getenv('PLANAR_THREADS', os.cpu_count() or 1)),
}


# ----------------------------
# Logging
# ----------------------------
# Plain timestamped lines on stderr for batch runs; formatters come from local.
LOGGING = {
    **LOGGING,
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'root': {'handlers': ['console'], 'level': 'INFO'},
    'loggers': {
        'planarpoly': {
            'handlers': ['console'],
            'level': os.getenv('PLANAR_LOG_LEVEL', 'INFO'),
            'propagate': False,
        },
        # node-doubling chatter
        'planarpoly.quadrature': {
            'handlers': ['console'],
            'level': 'WARNING',
            'propagate': False,
        },
        'scipy': {'handlers': ['console'], 'level': 'ERROR', 'propagate': False},
    },
}
