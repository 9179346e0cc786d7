#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Numerical experiments on the resolvent of the Schrodinger operator. See
``eigenbounds.py -h`` for the list of commands.
"""

from eigenbounds.cli import main


if __name__ == '__main__':
    main()
