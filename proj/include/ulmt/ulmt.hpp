#pragma once

#include "ulmt/algebra.hpp"
#include "ulmt/enumeration.hpp"
#include "ulmt/error.hpp"
#include "ulmt/io.hpp"
#include "ulmt/modeltheory.hpp"
#include "ulmt/parser.hpp"
#include "ulmt/random.hpp"
#include "ulmt/search.hpp"
#include "ulmt/semantics.hpp"
#include "ulmt/syntax.hpp"
#include "ulmt/tableaux.hpp"
#include "ulmt/types.hpp"
