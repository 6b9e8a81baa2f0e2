#pragma once

#include "automfm/behavior.hpp"
#include "automfm/caex.hpp"
#include "automfm/consistency.hpp"
#include "automfm/error.hpp"
#include "automfm/exchange.hpp"
#include "automfm/fixture.hpp"
#include "automfm/mapping.hpp"
#include "automfm/metamodel.hpp"
#include "automfm/parameters.hpp"
#include "automfm/path.hpp"
#include "automfm/violation.hpp"
#include "automfm/xml.hpp"
