from setuptools import setup, find_packages

setup(
    name="dudesim",
    version="0.1.0",
    python_requires=">=3.10",
    packages=find_packages(exclude=["examples", "examples.*"]),
    install_requires=["numpy", "toml", "zstandard"],
    entry_points={"console_scripts": ["dudesim=src.cli.commands:main"]},
)
