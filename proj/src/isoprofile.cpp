#include "capgeo/isoprofile.hpp"
