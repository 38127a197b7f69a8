"""Build script for the optional compiled kernel extension.

The package is fully functional without the extension; ``entcorr.kernels``
falls back to vectorized numpy implementations when ``entcorr._kernels``
cannot be imported.  Building is attempted here and skipped with a warning
if Cython or a C toolchain is unavailable.
"""

import sys

from setuptools import setup


def make_extensions():
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError as exc:
        print(f"entcorr: skipping compiled kernels ({exc})", file=sys.stderr)
        return []
    ext = Extension(
        "entcorr._kernels",
        sources=["src/entcorr/_kernels.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize(
        [ext],
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "language_level": "3",
        },
    )


setup(ext_modules=make_extensions())
