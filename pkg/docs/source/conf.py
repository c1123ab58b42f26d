import os
import sys

sys.path.insert(0, os.path.abspath("../.."))

from bgkness import __version__  # noqa

project = "bgkness"
copyright = "2026, bgkness developers"
author = "bgkness developers"
version = __version__
release = version

extensions = [
    "sphinx.ext.autosectionlabel",
    "sphinx.ext.mathjax",
    "sphinx.ext.napoleon",
    "sphinx.ext.viewcode",
    "sphinx.ext.autodoc.typehints",
    "sphinx.ext.todo",
    "autoapi.extension",
]

autodoc_typehints = "description"

autoapi_dirs = ["../../bgkness"]
autoapi_member_order = "groupwise"
autoapi_add_toctree_entry = False

autosectionlabel_prefix_document = True

exclude_patterns = []

html_theme = "pydata_sphinx_theme"
