from setuptools import setup

setup(name="tiny", version="0.1", py_modules=["tiny"])
