# -*- coding: utf-8 -*-
#
# AquaCover documentation build configuration file.

import os
import re
import sys
sys.path.insert(0, os.path.abspath('../'))

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.intersphinx',
    'sphinx.ext.todo',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'AquaCover'
copyright = u'2026, AquaCover developers'
author = u'AquaCover developers'

with open(os.path.join(os.path.dirname(__file__), '..', 'aquacover', '__init__.py')) as f:
    release = re.search(r"^__version__ = ['\"]([^'\"]*)['\"]", f.read(), re.M).group(1)
version = '.'.join(release.split('.')[:2])

language = 'en'
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']
pygments_style = 'sphinx'
todo_include_todos = False

autodoc_member_order = 'bysource'

# -- Options for HTML output ----------------------------------------------

html_theme = 'alabaster'
html_static_path = []
htmlhelp_basename = 'AquaCoverdoc'

# -- Options for LaTeX output ---------------------------------------------

latex_documents = [
    (master_doc, 'AquaCover.tex', u'AquaCover Documentation', u'AquaCover developers', 'manual'),
]

man_pages = [
    (master_doc, 'aquacover', u'AquaCover Documentation', [author], 1)
]

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable/', None),
    'pandas': ('https://pandas.pydata.org/docs/', None),
}
