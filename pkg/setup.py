from setuptools import setup, find_packages

setup(
    name="squarekit",
    version="0.1.0",
    description="Square-based matrix, transform and convolution kernels with cycle-level hardware models",
    packages=find_packages(where="src"),
    package_dir={"": "src"},
    python_requires=">=3.10",
    install_requires=[
        "pydantic>=2.7.0",
        "pydantic-settings>=2.0.0",
        "python-dotenv>=1.0.1",
        "numpy>=1.26.0",
        "psutil>=5.9.0",
    ],
    entry_points={
        "console_scripts": [
            "squarekit=squarekit.cli:main",
        ],
    },
)
