from setuptools import setup


with open("README.md") as f:
    readme = f.read()

setup(
    name="vset",
    version="0.1.0",
    description="Solve set equations over a variant universe of well-founded sets",
    long_description=readme,
    long_description_content_type="text/markdown",
    packages=["vset", "vset_cli"],
    python_requires=">=3.8",
    install_requires=["click>=7.1", "click-plugins", "numpy"],
    entry_points="""
        [console_scripts]
        vset=vset_cli.cli:cli
    """,
)
