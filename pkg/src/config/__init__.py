#!/usr/bin/env python3
# coding: utf-8

# plonkalab - config package
# Settings come from the environment, with a .env file in the working directory taking part

import logging

from dotenv import load_dotenv

load_dotenv()

from config.config import *
from config.constant import *

# library default; the command line reconfigures through setup_comprehensive_logging
logging.basicConfig(
    level=logging.WARNING,
    format="[%(asctime)s %(name)s %(levelname).1s] %(message)s",
    datefmt="%Y-%m-%d %H:%M:%S",
)
