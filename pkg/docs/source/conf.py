# Sphinx configuration of the kahler_lab documentation
# https://www.sphinx-doc.org/en/master/usage/configuration.html
import os
import sys

import sphinx_rtd_theme

sys.path.insert(0, os.path.abspath(os.path.join('..', '..', 'src')))

project = 'kahler_lab'
copyright = '2026, kahler_lab developers'
author = 'kahler_lab developers'
release = '0.1.0'

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.autosummary',
    'sphinx.ext.mathjax',
    'sphinx.ext.napoleon',  # Google style docstrings
    'autoapi.extension',
    'sphinx_rtd_theme',
]

latex_documents = [
    ('index', 'index.tex', 'kahler lab', '', 'manual'),
]

templates_path = ['_templates']
exclude_patterns = []

html_theme = 'sphinx_rtd_theme'

# AutoApi
autoapi_type = 'python'
autoapi_dirs = ['../../src']
autoapi_generate_api_docs = True
autoapi_options = [
    'members',
    'undoc-members',
    'show-inheritance',
    'show-module-summary',
]
autoapi_file_patterns = ['*.py']

# Internationalization
locale_dirs = ['../locale/']
gettext_compact = False
