import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "euler2d._cascade_cy",
                ["src/euler2d/_cascade_cy.pyx"],
                extra_compile_args=["-O3"],
                include_dirs=[numpy.get_include()],
            )
        ],
        language_level=3,
    )
except ImportError:
    # Pure-python cascade kernel is used when the extension is unavailable.
    ext_modules = []

setup(ext_modules=ext_modules)
