from setuptools import setup, find_packages

setup(
    name="citecheck",
    version="0.1",
    description="Author-level citation indicators, bootstrap stability intervals and correlation analyses",
    packages=find_packages(exclude=["tests", "tests.*"]),
    python_requires=">=3.8",
    install_requires=[
        "colorama>=0.4.6",
        "numpy>=1.22",
        "pandas>=1.5",
        "scipy>=1.7",
    ],
    extras_require={
        "test": ["pytest>=7", "hypothesis>=6"],
    },
    entry_points={
        'console_scripts': [
            'citecheck=citecheck.cli:main',
        ],
    },
)
