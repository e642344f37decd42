"""Build script: compiles the optional Cython kernel when Cython is present.

The package is fully functional without the extension; ``bideform._kernel``
falls back to the pure-Python twins at import time.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("bideform._speedups", ["src/bideform/_speedups.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
