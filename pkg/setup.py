from setuptools import setup, Extension
from Cython.Build import cythonize

ext_module = Extension(
    "edlab._kernels",
    ["src/edlab/_kernels.pyx"],
    extra_compile_args=["-O2"],
)

setup(
    ext_modules=cythonize(ext_module, language_level=3),
)
