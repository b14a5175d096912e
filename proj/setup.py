import glob

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup


def eigen_include():
    for path in ("/usr/include/eigen3", "/usr/local/include/eigen3"):
        if glob.glob(path + "/Eigen/Dense"):
            return [path]
    return []


ext = Pybind11Extension(
    "pfadapt",
    sorted(glob.glob("src/*.cpp")) + ["src/python/bindings.cpp"],
    include_dirs=["include"] + eigen_include(),
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
