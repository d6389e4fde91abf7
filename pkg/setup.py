from setuptools import setup, find_packages
import os.path

with open("README.rst") as infile:
   readme = infile.read()
with open(os.path.join("docs", "CHANGES.txt")) as infile:
   changes = infile.read()
long_desc = readme + '\n\n' + changes

setup(
    name='qcwt',
    version='0.1.dev0',
    description='''Quaternion Fourier and continuous quaternion wavelet transforms on the plane''',
    long_description=long_desc,
    keywords=['quaternion', 'fourier', 'wavelet', 'uncertainty principle'],
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Operating System :: OS Independent",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Mathematics",
        ],
    packages=find_packages(exclude=['tests']),
    include_package_data=True,
    zip_safe=True,
    license='MIT',
    python_requires='>=3.7',
    install_requires=[
        'numpy>=1.17',
        'scipy>=1.4',
        "importlib_metadata; python_version < '3.8'",
    ],
    tests_require=[
        'hypothesis',
    ],
    extras_require={
        'test': ['hypothesis'],
    },
    entry_points={
        'console_scripts': [
            'qcwt = qcwt.main:main',
        ]
    },
    test_suite='tests'
)
