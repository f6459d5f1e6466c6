"""
Setup script for the 'polydamage' project.

This script is used to package and distribute the 'polydamage' solver.
It reads the required dependencies from the 'requirements.txt' file and configures
the package for installation using setuptools. The script also sets up an entry point
for running the solver from the command line.

Attributes:
    current_directory (str): The absolute path of the directory where setup.py is located.
    req_txt_path (str): The absolute path to the 'requirements.txt' file.

Functions:
    read_requirements(): Reads the dependencies from 'requirements.txt' and returns
    them as a list of strings.
"""

import os

from setuptools import setup, find_namespace_packages

# Get the directory where setup.py is located
current_directory = os.path.abspath(os.path.dirname(__file__))
req_txt_path = os.path.join(current_directory, "requirements.txt")

# Read the contents of requirements.txt
def read_requirements():
    """
    Reads the dependencies listed in the 'requirements.txt' file.

    Blank lines and comments are skipped.

    Returns:
        list of str: A list of package dependencies required for the project.
    """
    with open(req_txt_path, 'r', encoding='utf-8') as req_file:
        lines = (line.strip() for line in req_file.read().splitlines())
        return [line for line in lines if line and not line.startswith('#')]

setup(
    name='polydamage',
    author='code_crafters team',
    version='0.1.0',
    description="Polygonal assumed-strain finite elements with nonlocal damage",
    packages=find_namespace_packages(include=['polydamage', 'polydamage.*']),
    py_modules=['main'],
    license="MIT",
    include_package_data=True,
    install_requires=read_requirements(),
    extras_require={
        'test': ['pytest>=7'],
    },
    python_requires='>=3.9',
    entry_points={
        'console_scripts': [
            'polydamage = main:main',
        ],
    },
)
