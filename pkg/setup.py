"""Build script: compiles the optional Cython kernel.

The package is fully functional without the extension (the pure-Python
kernel in formalpatch._kernel_py is selected at import time when the
compiled module is missing), so any compilation failure downgrades to a
pure build instead of aborting the install.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/formalpatch/_kernel_cy.pyx"],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - depends on build host
    print("formalpatch: skipping compiled kernel (%s); pure-Python fallback will be used" % exc)

setup(ext_modules=ext_modules)
