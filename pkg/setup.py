"""Optional compiled kernels; the package falls back to pure Python without them."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("CAPELLI_NO_EXTENSION") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("capelli.exactcore._kernels", ["src/capelli/exactcore/_kernels.pyx"])],
            compiler_directives={"language_level": "3"},
            quiet=True,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
