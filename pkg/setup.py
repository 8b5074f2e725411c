"""Build script: compiles the optional fast kernel.

The package works without the extension (a pure-Python kernel is selected at
import time), so any failure here should degrade to a pure build rather than
abort the install.
"""

from setuptools import Extension, setup


def _extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "chi_audit._ckernel",
        sources=["src/chi_audit/_ckernel.pyx"],
        # no -ffast-math, contraction off: the compiled kernel must keep IEEE
        # semantics so its results match the pure-Python kernel bit for bit
        extra_compile_args=["-O2", "-ffp-contract=off"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=_extensions())
