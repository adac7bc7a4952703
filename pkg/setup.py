"""Build script: compiles the optional extension core when a toolchain is present.

The package is fully functional without the extension (a numpy fallback is
selected at import time), so every failure mode here degrades to a pure build.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "jacobiweyl._core._corekernels",
                ["src/jacobiweyl/_core/_corekernels.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O2"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception:
    ext_modules = []

setup(ext_modules=ext_modules)
