import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # The package stays importable without the compiled core; the kernel
    # dispatcher falls back to the pure-numpy backend.
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "tslattice._kernels._cykernels",
                ["src/tslattice/_kernels/_cykernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
        },
    )

setup(ext_modules=ext_modules)
