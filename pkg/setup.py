#!/usr/bin/env python3
"""
Setup file for the grayforge construction toolkit.
"""

from setuptools import setup, find_packages

setup(
    name='grayforge',
    version='1.0.0',
    packages=find_packages(exclude=['tests', 'tests.*']),
    install_requires=[
        'numpy>=1.26.4',
        'scipy>=1.11.4',
        'pandas>=2.2.0',
        'pydantic>=2.5.1',
        'structlog>=23.2.0',
        'python-dotenv>=1.0.0',
        'click>=8.1.7',
        'jsonschema>=4.20.0',
    ],
    entry_points={
        'console_scripts': [
            'grayforge=src.pipeline.cli:main',
        ],
    },
    python_requires='>=3.9',
)
