"""Build script: compiles the kernel extension when Cython is available.

The package works without the extension (a NumPy fallback is selected at
import time), so the build degrades gracefully instead of failing.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "rconvex.kernels._native",
                ["src/rconvex/kernels/_native.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
else:
    ext_modules = []

setup(ext_modules=ext_modules)
