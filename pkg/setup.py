"""Build script for the optional compiled Fock kernels.

The package works without the extension; ``bogofock.fock.kernels`` falls
back to the numpy implementation when the compiled module is missing.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("BOGOFOCK_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "bogofock.fock._ckernels",
                    ["src/bogofock/fock/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
