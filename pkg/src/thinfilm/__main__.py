# -*- coding: utf-8 -*-

"""thinfilm main."""

from .cli import main

if __name__ == '__main__':
    main()
