# setup.py - Package setup configuration
from setuptools import setup, find_packages

setup(
    name="adhoc-routing-sim",
    version="0.1.0",
    packages=find_packages(include=["adhoc_routing_sim", "adhoc_routing_sim.*"]),
    package_data={"adhoc_routing_sim": ["presets/*.yml"]},
    install_requires=[
        "numpy>=1.22",
        "scipy>=1.8",
        "networkx>=2.8",
        "pandas>=1.4",
        "click>=8.0.0",
        "pyyaml>=5.1",
    ],
    extras_require={
        "test": [
            "pytest",
            "pytest-cov",
            "black",
            "isort",
            "flake8",
        ],
    },
    entry_points={
        "console_scripts": [
            "adhoc-routing-sim=adhoc_routing_sim.cli:main",
        ],
    },
    author="Your Name",
    author_email="your.email@example.com",
    description="Monte Carlo simulator for multihop routing in ad hoc networks",
    long_description=open("README.adoc").read(),
    long_description_content_type="text/x-asciidoc",
    keywords="ad hoc networks, routing, monte carlo, nakagami",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: System :: Networking",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "License :: OSI Approved :: MIT License",
    ],
    python_requires=">=3.9",
)
