"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a pure-Python fallback is selected
at import time), so a failed compile downgrades gracefully instead of
breaking the install.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/coopsearch/kernels/_core.pyx"],
        language_level="3",
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"coopsearch: building without compiled kernels ({exc})")

setup(ext_modules=ext_modules)
