#pragma once

#include "modlin/arith.hpp"
#include "modlin/bezout.hpp"
#include "modlin/bigint.hpp"
#include "modlin/crt.hpp"
#include "modlin/field.hpp"
#include "modlin/matrix.hpp"
#include "modlin/modsolve.hpp"
#include "modlin/problem_file.hpp"
#include "modlin/result.hpp"
#include "modlin/smith.hpp"
