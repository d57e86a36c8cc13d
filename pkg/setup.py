from setuptools import setup, find_packages

setup(
    name="phase-transition-lab",
    version="1.0.0",
    author="Saurabh Kadam",
    description="Phase Transition Lab - K-SAT and K-COL threshold numerics with a Monte Carlo bench",
    long_description=open("README.md").read(),
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["test", "test.*"]),
    python_requires=">=3.8",
    install_requires=[
        "pydantic>=2.5.0",
        "python-dotenv>=1.0.0",
        "numpy>=1.25.0",
        "scipy>=1.11.0",
        "networkx>=3.1",
    ],
    extras_require={
        "test": ["pytest>=7.4.3", "hypothesis>=6.88.0"],
    },
    entry_points={
        "console_scripts": ["phase-lab=app.main:main"],
    },
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
    ],
)
