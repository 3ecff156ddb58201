# BLAS multithreading is a net slowdown at these matrix sizes on small
# machines and makes the wall-time assertions unstable; pin to one thread
# before numpy is imported anywhere.
import os

for _var in (
    "OPENBLAS_NUM_THREADS",
    "OMP_NUM_THREADS",
    "MKL_NUM_THREADS",
    "NUMEXPR_NUM_THREADS",
    "VECLIB_MAXIMUM_THREADS",
):
    os.environ.setdefault(_var, "1")
