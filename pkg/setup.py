"""Build the optional Cython solver kernel.

The package is fully functional without the extension (a pure-Python
kernel is selected at import time); the compiled kernel is what makes
full proof campaigns practical, so we try hard to build it but never
fail the install over it.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "polydiam.kernel._ckernel",
                ["src/polydiam/kernel/_ckernel.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level="3",
    )

setup(ext_modules=ext_modules)
