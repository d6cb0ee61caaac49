from setuptools import setup, find_packages

setup(
    name="freefront",
    version="0.1.0",
    packages=find_packages(),
    install_requires=[
        "aiofiles>=23.2.1",
        "numpy>=1.26",
        "scipy>=1.11",
    ],
    entry_points={"console_scripts": ["freefront=freefront.main:main"]},
    python_requires=">=3.10",
)
