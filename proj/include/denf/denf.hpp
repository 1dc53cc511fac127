// Convenience header pulling in the whole library.

#pragma once

#include "denf/cli.hpp"
#include "denf/encoding.hpp"
#include "denf/enforcer.hpp"
#include "denf/errors.hpp"
#include "denf/event.hpp"
#include "denf/formula.hpp"
#include "denf/formula_text.hpp"
#include "denf/netsim.hpp"
#include "denf/oracle.hpp"
#include "denf/rewrite.hpp"
#include "denf/simplify.hpp"
#include "denf/trace_io.hpp"
#include "denf/verify.hpp"
