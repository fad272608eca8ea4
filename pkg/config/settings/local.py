import os
from pathlib import Path
from dotenv import load_dotenv

# Load .env file
load_dotenv()

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent.parent

DEBUG = os.getenv('PLANAR_DEBUG', 'True') == 'True'

# Directory that relative --output paths are resolved against
OUTPUT_DIR = Path(os.getenv('PLANAR_OUTPUT_DIR', BASE_DIR / 'results'))


# ----------------------------
# Quadrature
# ----------------------------
QUADRATURE = {
    'ANGULAR_NODES': int(os.getenv('PLANAR_ANGULAR_NODES', 512)),
    'RADIAL_NODES': int(os.getenv('PLANAR_RADIAL_NODES', 64)),
    'MAX_NODES': 2 ** 14,
    'TOLERANCE': float(os.getenv('PLANAR_QUAD_TOLERANCE', 1e-12)),
    # moments with negative index are taken on a circle no larger than this
    'NEGATIVE_MOMENT_RADIUS_CAP': 1.1,
}


# ----------------------------
# Special functions
# ----------------------------
SPECFUN = {
    'GAMMA_CROSSOVER': 10.0,
    'GAMMA_MAX_ITERATIONS': 5000,
    'GAMMA_ACCURACY': 1e-15,
    'BARNES_SHIFT': 20.0,
}


# ----------------------------
# Orthogonal polynomials
# ----------------------------
ORTHOPOLY = {
    'DEGREE_CAP': 60,
    'CONDITIONING_WARNING': 40,
    'RESIDUAL_TOLERANCE': 1e-8,
    # 'main' uses (gamma/2 + alpha), 'appendix' uses (gamma/2 + alpha - 1)
    'DIFFID_PREFACTOR': os.getenv('PLANAR_DIFFID_PREFACTOR', 'main'),
}


# ----------------------------
# Level curves and regions
# ----------------------------
GEOMETRY = {
    'CURVE_POINTS': 720,
    'CUT_TOLERANCE': 1e-14,
    'U_WIDTH_FACTOR': 5.0,
    'DISC_DELTA': 1.0,
    'RESIDUAL_TOLERANCE': 1e-10,
    'ZERO_DISTANCE_LIMIT': 0.15,
}


# ----------------------------
# Asymptotic formulas
# ----------------------------
ASYMPTOTICS = {
    # 'uniform' uses the lower incomplete gamma (entire at z = 1),
    # 'printed' uses the upper incomplete gamma as typeset
    'DISC_CONVENTION': os.getenv('PLANAR_DISC_CONVENTION', 'uniform'),
    # level t of the contour Gamma_t in the integral comparisons, capped below z0
    'CONTOUR_T': 1.2,
}


# ----------------------------
# Painleve V
# ----------------------------
PAINLEVE = {
    'U_MAX': 60.0,
    'POLE_THRESHOLD': 1e6,
    'POLE_WINDOW': 0.2,
    'RTOL': 1e-12,
    'ATOL': 1e-300,
    'RESIDUAL_TOLERANCE': 1e-8,
    'U_MIN': 1e-2,
}


# ----------------------------
# Monte Carlo
# ----------------------------
ENSEMBLE = {
    'THREADS': int(os.getenv('PLANAR_THREADS', 1)),
    'CHUNK_SIZE': 256,
    'UNITARITY_TOLERANCE': 1e-10,
}


# ----------------------------
# Output
# ----------------------------
OUTPUT = {
    'FLOAT_FORMAT': '.17g',
}


# ----------------------------
# Logging
# ----------------------------
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,

    'formatters': {
        'simple': {
            'format': '[{levelname}] {name}: {message}',
            'style': '{',
        },
        'verbose': {
            'format': '[{asctime}] {levelname} {name} {message}',
            'style': '{',
        },
    },

    'handlers': {
        'console': {
            '()': 'planarpoly.cli.stderr_handler',
            'formatter': 'simple',
            'show_path': False,
        },
    },

    'root': {
        'handlers': ['console'],
        'level': 'WARNING',
    },

    'loggers': {
        'planarpoly': {
            'handlers': ['console'],
            'level': os.getenv('PLANAR_LOG_LEVEL', 'DEBUG' if DEBUG else 'INFO'),
            'propagate': False,
        },
        'scipy': {
            'handlers': ['console'],
            'level': 'WARNING',
            'propagate': False,
        },
    },
}
