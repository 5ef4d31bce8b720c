"""Build script for the optional compiled similarity kernel.

Set TALISMAN_SKIP_EXT=1 to install without the extension; the package
falls back to the numpy implementation at import time.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("TALISMAN_SKIP_EXT") != "1":
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "talisman._kernels._fastsim",
                ["src/talisman/_kernels/_fastsim.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        language_level="3",
    )

setup(ext_modules=ext_modules)
