import numpy
from setuptools import Extension, setup

# The compiled kernels are optional: without Cython (or a working C
# toolchain) the package installs anyway and falls back to the pure-Python
# implementations in fluctuate._kernels_py.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "fluctuate._kernels",
                ["src/fluctuate/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3", "-fopenmp"],
                extra_link_args=["-fopenmp"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
