"""Build hook for the optional compiled kernels.

The package works without them (the kernel package falls back to the numpy
implementation at import), so a missing Cython or C compiler downgrades the
install instead of failing it.
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


def _extensions():
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError as err:
        print(f"warning: compiled kernels skipped: {err}", file=sys.stderr)
        return []
    return cythonize(
        [
            Extension(
                "fareyshear._kernels._fast",
                ["src/fareyshear/_kernels/_fast.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )


class _OptionalBuildExt(build_ext):
    """Treat extension build failures as a downgrade, not an install failure."""

    def run(self):
        try:
            super().run()
        except Exception as err:
            print(f"warning: compiled kernels skipped: {err}", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as err:
            print(f"warning: compiled kernels skipped: {err}", file=sys.stderr)


setup(ext_modules=_extensions(), cmdclass={"build_ext": _OptionalBuildExt})
