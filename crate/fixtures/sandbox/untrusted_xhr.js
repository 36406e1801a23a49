// outcome: rejected
var req = new XMLHttpRequest();
