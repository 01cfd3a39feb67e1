import os

from setuptools import Extension, setup

# The compiled tree-walk kernel is optional: the package falls back to the
# vectorized numpy kernel when the extension is absent.  Set MPSCAP_NO_EXT=1
# to skip compilation entirely.
ext_modules = []
if os.environ.get("MPSCAP_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "mpscap._kernels._tree_cy",
                    ["src/mpscap/_kernels/_tree_cy.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level="3",
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
