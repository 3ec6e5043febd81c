

from setuptools import setup

with open("README.md", 'r') as f:
    long_description = f.read()

setup(
   name='htrivpy',
   version='0.1.0',
   description='Classification of H-trivial line bundles on two-dimensional toric DM stacks',
   license="BSD-3",
   long_description=long_description,
   long_description_content_type='text/markdown',
   packages=['htrivpy',
             'htrivpy.first_mate',
             'htrivpy.htrivpy',
             'htrivpy.cartographer'],
   install_requires=['numpy', 'sympy', 'matplotlib', 'pytest', 'pytest-regtest', 'pytest-xdist'],
   entry_points={'console_scripts': ['htriv=htrivpy.cartographer.cli:main']},
)
