#!/usr/bin/env python3
# coding: utf-8

import sys
from pathlib import Path

sys.path.append(str(Path(__file__).parent / "src"))
