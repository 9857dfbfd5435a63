"""Build hook for the optional compiled kernels.

The Cython extension ``ecsolve._kernels`` is built when Cython and a C
compiler are available; otherwise the package installs with the pure-Python
kernels only and selects them at import time.
"""
import os
import warnings

from setuptools import Extension, setup


def _extensions():
    if os.environ.get("ECSOLVE_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        warnings.warn("Cython not found; installing pure-Python kernels only")
        return []
    ext = Extension(
        "ecsolve._kernels",
        ["src/ecsolve/_kernels.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize(
        [ext],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
        },
    )


setup(ext_modules=_extensions())
