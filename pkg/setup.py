"""Build script: compiles the optional integer-kernel extension.

The package is fully functional without the extension; intpoints.kernels
falls back to the pure-Python twin when the compiled module is missing.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("intpoints._kernels_cy", ["src/intpoints/_kernels_cy.pyx"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
