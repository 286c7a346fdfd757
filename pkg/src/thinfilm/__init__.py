# -*- coding: utf-8 -*-

"""A desk-scale laboratory for thin-film equations with lower-order backwards/forwards diffusion."""

VERSION = '0.1.0-dev'
