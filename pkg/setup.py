"""Build hook: compile the optional diffraction kernel.

The compiled extension is a pure accelerator. If Cython or a C compiler
is unavailable the install still succeeds and qcforge falls back to the
NumPy implementation at import time.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "qcforge._kernels",
                ["src/qcforge/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-env dependent
    print(f"qcforge: skipping compiled kernel ({exc}); NumPy fallback will be used")

setup(ext_modules=ext_modules)
