import numpy as np
from setuptools import Extension, setup

# The compiled kernel is optional: eightloop.kernels falls back to the
# pure-python implementation if the extension is missing.
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "eightloop._kernels",
                ["src/eightloop/_kernels.pyx"],
                include_dirs=[np.get_include()],
            )
        ],
        language_level=3,
    )
except Exception:
    extensions = []

setup(ext_modules=extensions)
