"""Install ``act`` as an importable package."""

from setuptools import setup, find_packages


setup(
    name='arxiv-act',
    version='0.1.0',
    packages=[f'arxiv.{package}' for package in find_packages('arxiv')],
    zip_safe=False,
    install_requires=[
        'numpy>=1.17',
        'dataclasses>=0.6; python_version<"3.7"'
    ],
    entry_points={
        'console_scripts': ['act=arxiv.act.cli:main']
    }
)
