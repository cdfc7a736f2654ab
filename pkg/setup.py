"""Build script for the optional compiled stepping kernel.

The package is fully functional without the extension: a NumPy
implementation of the same kernel is selected at import time when the
compiled module is missing, so a failed build must not break installation.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, broken toolchain, ...
            print(f"WARNING: compiled kernel not built ({exc}); "
                  "the NumPy backend will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"WARNING: compiled kernel not built ({exc}); "
                  "the NumPy backend will be used")


def extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError as exc:
        print(f"WARNING: compiled kernel not built ({exc}); "
              "the NumPy backend will be used")
        return []
    ext = Extension(
        "fpkin._step_cy",
        ["src/fpkin/_step_cy.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level="3")


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
