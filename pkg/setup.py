from setuptools import Extension, setup

import numpy as np

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "ctqwalk._chebcore",
                ["src/ctqwalk/_chebcore.pyx"],
                include_dirs=[np.get_include()],
                # -fcx-limited-range: naive complex multiply (no inf/nan
                # fixup calls), matching what numpy does elementwise
                extra_compile_args=["-O3", "-fcx-limited-range"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
