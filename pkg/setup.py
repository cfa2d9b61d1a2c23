"""Builds the optional compiled interpreter loop.

Without Cython or a C compiler the package installs as pure Python and
``revertlab.evm.kernel`` falls back to the Python loop.
"""
from setuptools import setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        ["src/revertlab/evm/_kernel.pyx"],
        compiler_directives={"language_level": "3"},
        quiet=True,
    )

setup(ext_modules=ext_modules)
