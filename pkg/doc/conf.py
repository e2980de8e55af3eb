#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# novikov-cubes documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

import sys, os, re

# If extensions (or modules to document with autodoc) are in another directory,
# add these directories to sys.path here. If the directory is relative to the
# documentation root, use os.path.abspath to make it absolute, like shown here.
sys.path.insert(0, os.path.abspath(".."))

# -- General configuration ------------------------------------------------

needs_sphinx = "1.6"

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.autosummary",
    "sphinx.ext.todo",
    "sphinx.ext.mathjax",
    "sphinx.ext.napoleon",
    "sphinx.ext.intersphinx",
    "sphinx.ext.viewcode",
    "sphinx_automodapi.automodapi",
]

autosummary_generate = True
autosummary_imported_members = False
automodapi_toctreedirnm = "code/api"
automodsumm_inherited_members = True

source_suffix = ".rst"

# The master toctree document.
master_doc = "index"

# General information about the project.
project = "novikov-cubes"
copyright = "2026, The novikov-cubes Developers"
author = "The novikov-cubes Developers"

add_module_names = False

import novikov_cubes

# The full version, including alpha/beta/rc tags.
release = novikov_cubes.__version__

# The short X.Y version.
version = re.match(r"^(\d+\.\d+)", release).expand(r"\1")

language = "en"

today_fmt = "%Y-%m-%d"

exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]

show_authors = True

pygments_style = "sphinx"

todo_include_todos = True

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable", None),
    "sympy": ("https://docs.sympy.org/latest", None),
}

# -- Options for HTML output ----------------------------------------------

html_theme = "sphinx_rtd_theme"

htmlhelp_basename = "novikov-cubesdoc"

# -- Options for manual page output ---------------------------------------

man_pages = [(master_doc, "novikov-cubes", "novikov-cubes Documentation", [author], 1)]

# ============================================================

# the order in which autodoc lists the documented members
autodoc_member_order = "bysource"
