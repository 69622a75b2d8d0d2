from setuptools import setup, find_packages

setup(
    name="ghz-anon",
    version="0.1.0",
    packages=find_packages(exclude=['tests', 'tests.*']),
    package_data={
        'ghz_anon': ['config/config.yaml'],
    },
    install_requires=[
        'numpy>=1.24.0',
        'scipy>=1.10.0',
        'pyyaml>=6.0',
        'python-dotenv>=1.0.0',
        'colorama>=0.4.6',
        'tabulate>=0.9.0',
    ],
    entry_points={
        'console_scripts': [
            'ghz-anon=ghz_anon.run_experiment:main',
        ],
    },
    python_requires='>=3.8',
    description="Anonymous communication over imperfect GHZ resources: protocols, self-testing and bound checks",
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Physics',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
    ],
)
