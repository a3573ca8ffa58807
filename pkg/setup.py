"""Builds the optional compiled event kernel.

The package works without it; ``qdi_adders.sim.kernel`` falls back to the
pure-Python implementation when the extension is missing.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("QDI_ADDERS_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "qdi_adders.sim._ckernel",
                    ["src/qdi_adders/sim/_ckernel.pyx"],
                    language="c++",
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
