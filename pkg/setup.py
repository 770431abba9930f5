from setuptools import setup, Extension

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("fisengine._kernels._core", ["src/fisengine/_kernels/_core.pyx"])],
        language_level=3,
    )

setup(ext_modules=ext_modules)
