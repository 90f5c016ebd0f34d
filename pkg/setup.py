"""Build script: compiles the optional Cython kernel extension.

The package is fully functional without the extension (a numpy fallback is
selected at import time); the extension accelerates the O(n^2) Volterra
evaluation and the depth-marching reference integrator.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext = Extension(
        "zeropi._fastkern",
        ["src/zeropi/_fastkern.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"],
    )
    ext_modules = cythonize([ext], language_level="3")
except ImportError:  # pragma: no cover - pure-python install path
    print("zeropi: Cython/numpy unavailable at build time; "
          "installing without the compiled kernel (numpy fallback is used).")

setup(ext_modules=ext_modules)
