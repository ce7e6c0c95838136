from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = [
    Extension(
        "tailasym._speedups",
        ["src/tailasym/_speedups.pyx"],
        extra_compile_args=["-O3"],
        optional=True,
    )
]

setup(
    ext_modules=cythonize(extensions, language_level=3) if cythonize else [],
)
