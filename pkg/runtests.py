#!/usr/bin/env python
# -*- coding: utf-8
import os
import sys
import unittest


def run_tests(*test_args):
    if not test_args:
        test_args = ['tomojoint']

    os.environ.setdefault('TOMOJOINT_SETTINGS_MODULE', 'tomojoint.tests.settings')
    loader = unittest.TestLoader()
    suite = unittest.TestSuite()
    for label in test_args:
        if os.path.isdir(label.replace('.', os.sep)):
            suite.addTests(loader.discover(label.replace('.', os.sep), pattern='tests.py',
                                           top_level_dir=os.path.dirname(os.path.abspath(__file__))))
        else:
            suite.addTests(loader.loadTestsFromName(label))
    result = unittest.TextTestRunner(verbosity=1).run(suite)
    sys.exit(not result.wasSuccessful())


if __name__ == '__main__':
    run_tests(*sys.argv[1:])
