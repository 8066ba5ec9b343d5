import setuptools

setuptools.setup(
    name="ruled_surfaces",
    version="0.1.0",
    author="FoCo Lab",
    description="Exact calculator for ruled surfaces over elliptic curves: Segre invariants, elementary transformations and automorphism groups",
    long_description=open('README.md').read(),
    long_description_content_type="text/markdown",
    url="",
    packages=setuptools.find_packages(exclude=['tests', 'tests.*']),
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
    install_requires=[
          'numpy>=1.13.3',
          'pandas',
          'sympy>=1.7',
      ],
    extras_require={
        'test': ['pytest'],
    },
    entry_points={
        'console_scripts': ['ruled-surfaces = ruled_surfaces.cli:main'],
    },
    python_requires='>=3.8',
)
