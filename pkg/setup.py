import re
import setuptools


extras_require = {
    'tests': [
        'pytest >=6',
        'pytest-cov >=2.10',
    ],
    'plot': [
        'matplotlib >=3.3',
    ],
}

packages = setuptools.find_packages('.', include=('numline', 'numline.*'))

setuptools.setup(
    name='numline',
    version=(
        re
        .compile(r".*__version__ = '(.*?)'", re.S)
        .match(open('numline/__init__.py').read())
        .group(1)
    ),
    license='ISC',
    description='Number-aware tokenization and number decoding for masked number prediction.',
    long_description=open('README.rst').read(),
    packages=packages,
    include_package_data=True,
    python_requires='>=3.8',
    extras_require=extras_require,
    install_requires=[
        'numpy >=1.20',
        'scipy >=1.7',
    ],
    entry_points={
        'console_scripts': [
            'numline = numline.cli:main',
        ],
    },
    classifiers=[
        'Intended Audience :: Science/Research',
        'Development Status :: 4 - Beta',
        'Natural Language :: English',
        'Topic :: Scientific/Engineering :: Artificial Intelligence',
        'License :: OSI Approved :: ISC License (ISCL)',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
    ],
)
