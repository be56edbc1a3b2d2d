#pragma once

#include "foon/core.hpp"
#include "foon/dot.hpp"
#include "foon/errors.hpp"
#include "foon/parser.hpp"
#include "foon/retrieval.hpp"
