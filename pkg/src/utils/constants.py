"""Application-wide constants."""

# Version info
APP_NAME = "MetaBound Lab"
APP_DESCRIPTION = "Meta-RL generalization bound and convergence laboratory"

# MDP validation and solvers
PROBABILITY_TOLERANCE = 1e-9
DIRECT_SOLVE_MAX_STATES = 64
EVALUATION_RESIDUAL = 1e-10
EVALUATION_MAX_ITERS = 100_000
DEFAULT_VALUE_TOL = 1e-10
VALUE_ITERATION_MAX_ITERS = 1_000_000

# Gradients
DEFAULT_FD_STEP = 1e-5
DEFAULT_HVP_STEP = 1e-5
DETERMINISTIC_LOGIT_MARGIN = 20.0

# Task families
GRID_SIDE = 5
GRID_STATES = GRID_SIDE * GRID_SIDE
GRID_ACTIONS = 4
GRID_MOVE_PROBABILITY = 0.9

# Seed-stream field tags
TAG_BASE_TRANSITIONS = 1
TAG_BASE_REWARDS = 2
TAG_TASK_TRANSITIONS = 3
TAG_TASK_REWARDS = 4
TAG_GOAL = 5
TAG_REPLICATE = 6
TAG_BATCH = 7
TAG_CELL = 8
TAG_RADEMACHER = 9

# Convergence diagnostics
FIT_R_SQUARED_THRESHOLD = 0.98
SUPERLINEAR_ORDER_THRESHOLD = 1.5
FLOOR_SEARCH_LOG_OFFSETS = (-30.0, 3.0)
FLOOR_SEARCH_GRID_POINTS = 133
DEFAULT_CONVERGENCE_WINDOW = 10

# Bounds
DEFAULT_CONFIDENCE = 0.95
GAP_FLOOR = 1e-9
MIN_FIT_POINTS = 3
COMPLEXITY_TASKS = 100

# Experiment defaults
DEFAULT_N_TEST = 64
DEFAULT_N_SEEDS = 20
DEFAULT_TARGET_FRACTION = 0.9
DEFAULT_RADEMACHER_DRAWS = 1000
DEFAULT_OUTPUT_DIR = "results"

# Result files
GAPS_FILE = "gaps.csv"
COMPARISON_FILE = "comparison.csv"
RUNLOG_FILE = "runlog.csv"
COMPLEXITY_FILE = "complexity.csv"
FITS_CSV_FILE = "fits.csv"
FITS_JSON_FILE = "fits.json"
TASKS_FILE = "tasks.json"
CELL_RUNLOG_FILE = "runlog_cell.csv"

# Environment
PARALLEL_ENV_VAR = "METABOUND_PARALLEL"
