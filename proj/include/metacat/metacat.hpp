#pragma once

#include "metacat/dot.hpp"
#include "metacat/dump.hpp"
#include "metacat/elaborate.hpp"
#include "metacat/errors.hpp"
#include "metacat/fol.hpp"
#include "metacat/hypergraph.hpp"
#include "metacat/oracle.hpp"
#include "metacat/parse.hpp"
#include "metacat/proof.hpp"
#include "metacat/syntax.hpp"
