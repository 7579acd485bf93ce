"""Build hook for the optional compiled propagation kernels.

The package works without the extension: ``bichroma._backend`` falls back to
pure Python when ``bichroma._kernels`` cannot be imported.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("BICHROMA_NO_EXT", "") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "bichroma._kernels",
                    ["src/bichroma/_kernels.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
