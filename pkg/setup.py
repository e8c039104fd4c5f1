from setuptools import find_packages, setup

setup(
    name="src",
    packages=find_packages(exclude=["tests"]),
    version="0.1.0",
    description="Lin-Lu-Yau and Forman Ricci flows on weighted graphs",
    license="",
    install_requires=[
        "mesa>=2.1,<4",
        "numpy",
        "scipy",
        "pandas",
        "networkx",
        "tqdm",
    ],
    entry_points={"console_scripts": ["ricci-flow=src.cli.main:run"]},
)
