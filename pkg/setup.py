import os

from setuptools import Extension, setup

import numpy as np

# The compiled kernels are an optimization, not a requirement.  If the
# toolchain is missing the package falls back to the numpy implementation
# selected at import time in swarmhydro._core.
ext_modules = []
if os.environ.get("SWARMHYDRO_PURE", "0") != "1":
    try:
        from Cython.Build import cythonize

        ext = Extension(
            "swarmhydro._core._speedups",
            sources=["src/swarmhydro/_core/_speedups.pyx"],
            include_dirs=[np.get_include()],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            # -fno-jump-tables: the potential-kind dispatch sits inside the
            # O(n^2) pair loop; as a jump table it becomes an indirect branch
            # per pair, which virtualized hosts execute an order of magnitude
            # slower than the equivalent compare chain.
            extra_compile_args=["-O3", "-fno-jump-tables"],
        )
        ext_modules = cythonize([ext], language_level="3")
    except ImportError:
        pass

setup(ext_modules=ext_modules)
