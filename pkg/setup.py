"""Build script for the optional compiled filter kernel.

The Cython extension is skipped when Cython is unavailable or compilation
fails; ``eogpipe.dsp.kernels`` then falls back to the pure-Python loop.
"""
from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "eogpipe.dsp._kernels",
                ["src/eogpipe/dsp/_kernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
