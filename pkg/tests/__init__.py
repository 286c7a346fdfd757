# -*- coding: utf-8 -*-

"""thinfilm tests."""
