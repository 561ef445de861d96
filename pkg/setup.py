from setuptools import setup
import codecs
import os
import re

here = os.path.abspath(os.path.dirname(__file__))


# Read the version number from a source file.
def find_version(*file_paths):
    with codecs.open(os.path.join(here, *file_paths), 'r', 'latin1') as f:
        version_file = f.read()

    # The version line must have the form
    # __version__ = 'ver'
    version_match = re.search(r"^__version__ = ['\"]([^'\"]*)['\"]",
                              version_file, re.M)
    if version_match:
        return version_match.group(1)
    raise RuntimeError("Unable to find version string.")


# Get the long description from the relevant file
with codecs.open(os.path.join(here, 'readme.md'), encoding='utf-8') as f:
    long_description = f.read()

install_requires = ['numpy>=1.17', 'scipy>=1.6', 'quantities', 'matplotlib>=1.3.1', 'pandas>=1.0']
tests_require = ['hypothesis']


setup(
    name="aquacover",
    version=find_version('aquacover', '__init__.py'),
    description="Online coverage path generation for fleets of Dubins surface vehicles",
    long_description=long_description,
    long_description_content_type='text/markdown',
    license='GPLv3',
    classifiers=[
        'Development Status :: 4 - Beta',

        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering',

        'License :: OSI Approved :: GNU General Public License v3 (GPLv3)',

        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
    ],

    keywords='coverage control, dubins vehicles, control barrier functions, surface vehicles',

    packages=['aquacover', 'aquacover.tests'],
    python_requires='>=3.8',

    install_requires=install_requires,
    tests_require=tests_require,
    extras_require={'test': tests_require},

    # bundled scenarios
    package_data={'aquacover': ['data/scenarios/*.xml']},
    include_package_data=True,
    zip_safe=False,
    test_suite='aquacover.tests.testsuite',

    entry_points={
        'console_scripts': ['aquacover=aquacover.cli:main'],
    },
)
