# Grid: symmetric interval (-X_MAX, X_MAX), odd node count so x = 0 is a node
X_MAX = 22.0
N_NODES = 4001

# Time stepping
DT = 2.5e-4
T_FINAL = 1.0
OUTPUT_EVERY = 400

# Reference wave (b, eps, A, C)
EPS = 0.1
B = -1.5
A = 1.0
C = 1.0

# Reference profile integration
RK_SUBSTEPS = 10
ODE_METHODS = ('rk4', 'euler')

# Perturbation amplitude
DELTA = 0.1
STABILITY_SWEEP = (0.2, 0.1, 0.05)

# Mollification: default width in cells, and the minimum the grid can resolve
MOLLIFY_CELLS = 10
MIN_MOLLIFY_CELLS = 3

# Spike-mass window around x = 0, in mollifier widths
SPIKE_WINDOW_WIDTHS = 5

# Newton iteration for the cubic term
NEWTON_TOL = 1e-12
NEWTON_MAX_ITER = 50

# Support containment: magnitude allowed at the first interior nodes
BOUNDARY_TOL = 1e-8

# Solver modes
V_MODES = ('decomposed', 'regularized')
SPLITTINGS = ('strang', 'lie')
TRANSPORT_SCHEMES = ('lax_friedrichs', 'crank_nicolson')

# Output
CSV_FLOAT_FORMAT = '%.17g'
DEFAULT_OUT_DIR = 'runs'
FAST_SUITE_BUDGET_S = 300
