"""Build hook for the optional compiled kernels.

The package works without a C compiler: if Cython or the compiler is missing,
the extension is skipped and ``ribbonforge.kernels`` falls back to NumPy.
"""
from setuptools import setup

try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "ribbonforge._ckernels",
                ["src/ribbonforge/_ckernels.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
