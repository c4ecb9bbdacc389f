import os

from setuptools import setup

# The compiled kernel is optional: if Cython or a C compiler is missing the
# package installs anyway and quiveralg.linalg falls back to the pure-Python
# implementation.  Set QUIVERALG_SKIP_EXT=1 to skip the build explicitly.

ext_modules = []
if os.environ.get("QUIVERALG_SKIP_EXT") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "quiveralg._kernels",
                    ["src/quiveralg/_kernels.pyx"],
                    extra_compile_args=["-O2"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
