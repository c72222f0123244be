__pkgname__ = 'scispace-workspace'
__version__ = '0.1.0'
__author__ = 'Matteo Vilucchio'
__license__ = 'MIT'
__summary__ = 'Desk-scale collaboration workspace over multiple data transfer nodes with attribute search'
__url__ = 'https://github.com/superporchetta/scispace'
