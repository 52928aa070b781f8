#pragma once

#include "entmom/cli.hpp"
#include "entmom/convexroof.hpp"
#include "entmom/criteria.hpp"
#include "entmom/errors.hpp"
#include "entmom/families.hpp"
#include "entmom/io.hpp"
#include "entmom/measures.hpp"
#include "entmom/moments.hpp"
#include "entmom/numerics.hpp"
#include "entmom/random.hpp"
#include "entmom/states.hpp"
