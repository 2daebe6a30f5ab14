"""Build script for the optional compiled kernels.

The package works without the extension: sharedstick._kernels falls back to
the pure-Python twin at import time, so any failure here is demoted to a
warning instead of aborting the install.
"""

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:
            warnings.warn(f"skipping compiled kernels: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"skipping compiled kernels ({ext.name}): {exc}")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        warnings.warn("Cython unavailable; pure-Python kernels will be used")
        return []
    ext = Extension(
        "sharedstick._kernels._core",
        ["src/sharedstick/_kernels/_core.pyx"],
        # No FP contraction: the compiled kernels must be bit-identical to
        # the pure-Python twin (see tests/test_kernel_parity.py).
        extra_compile_args=["-O2", "-ffp-contract=off"],
    )
    return cythonize([ext], language_level="3")


setup(cmdclass={"build_ext": OptionalBuildExt}, ext_modules=extensions())
