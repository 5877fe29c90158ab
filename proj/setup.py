import glob

from pybind11.setup_helpers import ParallelCompile, Pybind11Extension, build_ext
from setuptools import setup

ParallelCompile("NPY_NUM_BUILD_JOBS").install()

sources = sorted(
    f for f in glob.glob("src/*.cpp") if not f.endswith("cli_main.cpp")
)

ext = Pybind11Extension(
    "nlgrad._core",
    sources,
    include_dirs=["include", "/usr/include/eigen3"],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
