"""Build the optional compiled Monte Carlo kernel.

The package works without the extension (a pure numpy fallback is selected at
import time), so a missing compiler or Cython only costs speed.
-ffp-contract=off keeps the kernel bit-identical to the fallback: both sides
evaluate the same IEEE-754 expressions in the same order.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "bayesborrow._mc_kernel",
                sources=["src/bayesborrow/_mc_kernel.pyx"],
                extra_compile_args=["-O2", "-ffp-contract=off"],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
