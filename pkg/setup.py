#!/usr/bin/env python
# vim: set fileencoding=utf-8 :

# I used the following resources to compile the packaging boilerplate:
# https://python-packaging.readthedocs.io/en/latest/
# https://packaging.python.org/distributing/#requirements-for-packaging-and-distributing

from setuptools import find_packages, setup

def readme():
    with open('README.md') as f:
        return f.read()

setup(name='eigenbounds',
      version='0.1.0',
      description='Python package and script for numerical experiments on '
                  'uniform resolvent estimates and eigenvalue bounds of '
                  'Schrodinger operators with complex potentials.',
      long_description=readme(),
      license='LGPL',
      classifiers=[
          # How mature is this project? Common values are
          #   3 - Alpha
          #   4 - Beta
          #   5 - Production/Stable
          'Development Status :: 3 - Alpha',

          # Indicate who your project is intended for
          'Intended Audience :: Science/Research',
          'Topic :: Scientific/Engineering :: Mathematics',
          'Topic :: Scientific/Engineering :: Physics',

          # Environment
          'Operating System :: POSIX :: Linux',
          'Environment :: Console',
          'Natural Language :: English',

          'License :: OSI Approved :: GNU Lesser General Public License v3 (LGPLv3)',

          'Programming Language :: Python :: 3.7',
          'Programming Language :: Python :: 3.8'
      ],
      keywords='bessel resolvent schrodinger birman-schwinger lorentz',
      packages=find_packages(exclude=['scripts', 'tests']),
      # Install the scripts
      scripts=[
          'scripts/eigenbounds.py',
      ],
      install_requires=[
          'multiprocessing-logging',
          'numpy',
          # Bessel functions, quadrature and root finding
          'scipy',
          # Progress bar
          'tqdm'
      ],
      zip_safe=False)
