import os

from setuptools import setup
from setuptools.extension import Extension

# The compiled kernel module is optional: without Cython (or a working C
# compiler) the package falls back to the pure-Python kernels at import time.
ext_modules = []
if not os.environ.get("NDKIT_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "ndkit._kernels._fast",
                    ["src/ndkit/_kernels/_fast.pyx"],
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
