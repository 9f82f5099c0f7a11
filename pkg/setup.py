# setup.py
from setuptools import setup, find_packages

setup(
    name="exactregen",
    version="1.0",
    packages=find_packages(exclude=["tests", "tests.*"]),
    python_requires=">=3.9",
    install_requires=[
        'numpy',
        'galois',
        'loguru',
        'pydantic>=2',
        'python-dotenv',
    ],
    entry_points={
        'console_scripts': [
            'exactregen=src.main:main',
        ],
    },
)
