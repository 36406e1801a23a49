// outcome: rejected
var o = {};
with (o) { x = 1 }
